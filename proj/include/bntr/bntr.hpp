#pragma once

#include "bntr/dataset.hpp"
#include "bntr/elastic_net.hpp"
#include "bntr/error.hpp"
#include "bntr/format.hpp"
#include "bntr/ingest.hpp"
#include "bntr/io.hpp"
#include "bntr/model.hpp"
#include "bntr/rescale.hpp"
#include "bntr/solver.hpp"
#include "bntr/sphere.hpp"
#include "bntr/spline.hpp"
#include "bntr/synth.hpp"
#include "bntr/tensor.hpp"
#include "bntr/tuning.hpp"
