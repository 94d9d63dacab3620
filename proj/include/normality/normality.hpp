#pragma once

#include "normality/criteria.hpp"
#include "normality/error.hpp"
#include "normality/expr.hpp"
#include "normality/geometry.hpp"
#include "normality/lab.hpp"
#include "normality/levi.hpp"
#include "normality/mandelbrojt.hpp"
#include "normality/metrics.hpp"
#include "normality/metrics_selftest.hpp"
