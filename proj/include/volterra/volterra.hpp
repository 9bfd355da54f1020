#pragma once

#include "volterra/core.hpp"
#include "volterra/fixed_points.hpp"
#include "volterra/subfamilies.hpp"
