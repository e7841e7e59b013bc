#ifndef COMMAVG_COMMAVG_HPP
#define COMMAVG_COMMAVG_HPP

#include "actions.hpp"
#include "averages.hpp"
#include "checks.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "lambda.hpp"
#include "parallel.hpp"
#include "projector.hpp"
#include "random.hpp"
#include "scalar.hpp"
#include "spaces.hpp"
#include "union_find.hpp"
#include "io/grid_file.hpp"
#include "io/report.hpp"
#include "io/system_file.hpp"

#endif // COMMAVG_COMMAVG_HPP
