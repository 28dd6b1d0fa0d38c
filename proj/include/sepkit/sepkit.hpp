#pragma once

#include "core.hpp"
#include "graph.hpp"
#include "separation.hpp"
#include "oracle.hpp"
#include "flow.hpp"
#include "profiles.hpp"
#include "torso.hpp"
#include "lift.hpp"
#include "distinguisher.hpp"
#include "families.hpp"
#include "decomposition.hpp"
#include "io.hpp"
