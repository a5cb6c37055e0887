#pragma once

#include "locrank/classify.hpp"
#include "locrank/config.hpp"
#include "locrank/dataset.hpp"
#include "locrank/edf.hpp"
#include "locrank/erm.hpp"
#include "locrank/experiments.hpp"
#include "locrank/oracle.hpp"
#include "locrank/rankcrit.hpp"
#include "locrank/rate.hpp"
#include "locrank/rng.hpp"
#include "locrank/scoring.hpp"
