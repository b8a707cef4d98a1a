#pragma once

#include "rci/compositional.hpp"
#include "rci/containment.hpp"
#include "rci/error.hpp"
#include "rci/linalg.hpp"
#include "rci/lp.hpp"
#include "rci/network.hpp"
#include "rci/random.hpp"
#include "rci/rci_single.hpp"
#include "rci/runtime.hpp"
#include "rci/scenario.hpp"
#include "rci/simplex.hpp"
#include "rci/zonotope.hpp"
