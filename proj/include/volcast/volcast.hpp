#pragma once

#include "volcast/arma.hpp"
#include "volcast/backtest.hpp"
#include "volcast/date.hpp"
#include "volcast/descriptive.hpp"
#include "volcast/distributions.hpp"
#include "volcast/error.hpp"
#include "volcast/forecast.hpp"
#include "volcast/garch.hpp"
#include "volcast/optimize.hpp"
#include "volcast/simulate.hpp"
#include "volcast/timeseries.hpp"
