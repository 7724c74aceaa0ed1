#pragma once

// Umbrella header: the whole workbench in one include.

#include "common.hpp"
#include "ring.hpp"
#include "space.hpp"
#include "supports.hpp"
#include "section.hpp"
#include "koszul.hpp"
#include "cohomology.hpp"
#include "flows.hpp"
#include "io.hpp"
#include "suite.hpp"
