#pragma once

// Umbrella header.

#include "cotrack/colornames.hpp"
#include "cotrack/engine.hpp"
#include "cotrack/errors.hpp"
#include "cotrack/eval.hpp"
#include "cotrack/features.hpp"
#include "cotrack/frame.hpp"
#include "cotrack/geometry.hpp"
#include "cotrack/image_io.hpp"
#include "cotrack/knn.hpp"
#include "cotrack/kvconfig.hpp"
#include "cotrack/labeled_store.hpp"
#include "cotrack/labeling.hpp"
#include "cotrack/model_io.hpp"
#include "cotrack/otb_io.hpp"
#include "cotrack/qtable.hpp"
#include "cotrack/qtrain.hpp"
#include "cotrack/result_io.hpp"
#include "cotrack/rng.hpp"
#include "cotrack/sampling.hpp"
#include "cotrack/sequence.hpp"
#include "cotrack/svm.hpp"
#include "cotrack/synthetic.hpp"
#include "cotrack/tracker_config.hpp"
#include "cotrack/uncertainty.hpp"
