#pragma once

#include "mpmf/dataset.hpp"
#include "mpmf/error.hpp"
#include "mpmf/format.hpp"
#include "mpmf/io.hpp"
#include "mpmf/kernel.hpp"
#include "mpmf/linear_model.hpp"
#include "mpmf/measures.hpp"
#include "mpmf/moments.hpp"
#include "mpmf/mpm_baseline.hpp"
#include "mpmf/quadratic_form.hpp"
#include "mpmf/solver.hpp"
