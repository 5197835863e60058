#pragma once

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/random.hpp"
#include "echograph/parallel.hpp"
#include "echograph/graph.hpp"
#include "echograph/ingest.hpp"
#include "echograph/graph_metrics.hpp"
#include "echograph/polarity.hpp"
#include "echograph/special.hpp"
#include "echograph/stats.hpp"
#include "echograph/synth.hpp"
#include "echograph/text.hpp"
#include "echograph/forest.hpp"
#include "echograph/predict.hpp"
#include "echograph/pipeline.hpp"
