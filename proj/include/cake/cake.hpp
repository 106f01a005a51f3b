#pragma once

// Everything except the command-line layer.

#include "cake/rational.hpp"
#include "cake/piece.hpp"
#include "cake/valuation.hpp"
#include "cake/allocation.hpp"
#include "cake/oracle.hpp"
#include "cake/mechanisms.hpp"
#include "cake/rw.hpp"
#include "cake/properties.hpp"
#include "cake/ep_best_response.hpp"
#include "cake/scenarios.hpp"
#include "cake/io.hpp"
#include "cake/random.hpp"
