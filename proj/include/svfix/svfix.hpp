#pragma once

#include "svfix/continuity.hpp"
#include "svfix/correspondence.hpp"
#include "svfix/flagged_intervals.hpp"
#include "svfix/noncompactness.hpp"
#include "svfix/quadratic.hpp"
#include "svfix/random_driver.hpp"
#include "svfix/runner.hpp"
#include "svfix/scenario.hpp"
#include "svfix/selection.hpp"
#include "svfix/solver.hpp"
#include "svfix/unit_ball.hpp"
#include "svfix/value_set.hpp"
#include "svfix/vector.hpp"
