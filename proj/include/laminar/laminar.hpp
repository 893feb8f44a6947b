#pragma once

#include "laminar/error.hpp"
#include "laminar/words.hpp"
#include "laminar/pretzel.hpp"
#include "laminar/orderprover.hpp"
#include "laminar/leafspace.hpp"
#include "laminar/leafsuite.hpp"
#include "laminar/scenarios.hpp"
