#ifndef NSREG_NSREG_HPP
#define NSREG_NSREG_HPP

#include "criterion.hpp"
#include "criterion_spec.hpp"
#include "field.hpp"
#include "generators.hpp"
#include "grid.hpp"
#include "norms.hpp"
#include "operators.hpp"
#include "solver.hpp"
#include "time_series.hpp"

#endif
