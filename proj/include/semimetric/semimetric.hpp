#pragma once

#include "semimetric/core.hpp"
#include "semimetric/datasets.hpp"
#include "semimetric/error.hpp"
#include "semimetric/experiment.hpp"
#include "semimetric/io.hpp"
#include "semimetric/ksets.hpp"
#include "semimetric/matrix.hpp"
#include "semimetric/metrics.hpp"
#include "semimetric/partition.hpp"
#include "semimetric/sampling.hpp"
#include "semimetric/softmax.hpp"
#include "semimetric/spectral.hpp"
