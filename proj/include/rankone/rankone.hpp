#pragma once

#include "rankone/cache.hpp"
#include "rankone/classify.hpp"
#include "rankone/construction.hpp"
#include "rankone/correlation.hpp"
#include "rankone/descendants.hpp"
#include "rankone/diff_hist.hpp"
#include "rankone/epsilon.hpp"
#include "rankone/errors.hpp"
#include "rankone/geometry.hpp"
#include "rankone/levels.hpp"
#include "rankone/numbers.hpp"
#include "rankone/report.hpp"
#include "rankone/statistics.hpp"
#include "rankone/suites.hpp"
