#pragma once

#include "pareto/analytics.hpp"
#include "pareto/frontier.hpp"
#include "pareto/geometry.hpp"
#include "pareto/harness.hpp"
#include "pareto/point.hpp"
#include "pareto/quadrature.hpp"
#include "pareto/random.hpp"
#include "pareto/record_book.hpp"
#include "pareto/report_io.hpp"
#include "pareto/selftest.hpp"
#include "pareto/statistics.hpp"
#include "pareto/svg.hpp"
