#pragma once

// Everything except the JSON layer, which needs nlohmann/json.

#include "chain.hpp"
#include "end_segment.hpp"
#include "fin_space.hpp"
#include "fraisse.hpp"
#include "geometry.hpp"
#include "hrushovski.hpp"
#include "lazy.hpp"
#include "monoid.hpp"
#include "partial_map.hpp"
#include "rel_structure.hpp"
#include "topology.hpp"
#include "urysohn.hpp"
#include "zariski.hpp"
#include "zigzag.hpp"
