#pragma once

#include "brsim/asymptotics.hpp"
#include "brsim/bootstrap.hpp"
#include "brsim/config.hpp"
#include "brsim/distribution.hpp"
#include "brsim/exact.hpp"
#include "brsim/experiment.hpp"
#include "brsim/io.hpp"
#include "brsim/metrics.hpp"
#include "brsim/model.hpp"
#include "brsim/numeric.hpp"
#include "brsim/rng.hpp"
