#pragma once

// Umbrella header for the multi-view clustering library.

#include <mvclust/anchors.hpp>
#include <mvclust/common.hpp>
#include <mvclust/dataset.hpp>
#include <mvclust/embedding.hpp>
#include <mvclust/filter.hpp>
#include <mvclust/graph.hpp>
#include <mvclust/kmeans.hpp>
#include <mvclust/metrics.hpp>
#include <mvclust/pipeline.hpp>
#include <mvclust/subspace.hpp>
