#pragma once

// Umbrella header.

#include "iotauth/bits.hpp"
#include "iotauth/channel.hpp"
#include "iotauth/config.hpp"
#include "iotauth/detector.hpp"
#include "iotauth/digest.hpp"
#include "iotauth/errors.hpp"
#include "iotauth/feature.hpp"
#include "iotauth/keygen.hpp"
#include "iotauth/prbs.hpp"
#include "iotauth/reconcile.hpp"
#include "iotauth/report.hpp"
#include "iotauth/rng.hpp"
#include "iotauth/sim.hpp"
#include "iotauth/svm.hpp"
#include "iotauth/transcript.hpp"
#include "iotauth/trust.hpp"
