#pragma once

// Umbrella header for the simulator library.

#include "bounds.hpp"
#include "channel.hpp"
#include "cli.hpp"
#include "common.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "geometric_median.hpp"
#include "model.hpp"
#include "server.hpp"
#include "worker.hpp"
