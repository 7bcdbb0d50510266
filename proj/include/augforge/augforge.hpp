#pragma once

#include "augforge/analysis.hpp"
#include "augforge/array_api.hpp"
#include "augforge/augment.hpp"
#include "augforge/bench.hpp"
#include "augforge/error.hpp"
#include "augforge/evalstats.hpp"
#include "augforge/features.hpp"
#include "augforge/intervals.hpp"
#include "augforge/matrix.hpp"
#include "augforge/parallel.hpp"
#include "augforge/pipeline.hpp"
#include "augforge/random.hpp"
#include "augforge/signal_io.hpp"
#include "augforge/synthetic.hpp"
