#pragma once

#include "reswitch/error.hpp"
#include "reswitch/exactmath.hpp"
#include "reswitch/technology.hpp"
#include "reswitch/switching.hpp"
#include "reswitch/factorspace.hpp"
#include "reswitch/complementarity.hpp"
#include "reswitch/harness.hpp"
