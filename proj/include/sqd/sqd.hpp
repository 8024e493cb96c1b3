#pragma once

#include "geometry.hpp"
#include "graph.hpp"
#include "gen.hpp"
#include "io.hpp"
#include "ldd.hpp"
#include "stabbing.hpp"
#include "geo_ds.hpp"
#include "patterns.hpp"
#include "diam_ecc.hpp"
#include "oracle.hpp"
