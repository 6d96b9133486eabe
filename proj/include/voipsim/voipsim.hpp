#pragma once

#include "voipsim/engine.hpp"
#include "voipsim/error.hpp"
#include "voipsim/gps_oracle.hpp"
#include "voipsim/metrics.hpp"
#include "voipsim/network.hpp"
#include "voipsim/packet.hpp"
#include "voipsim/qdisc.hpp"
#include "voipsim/report.hpp"
#include "voipsim/scenario.hpp"
#include "voipsim/simulation.hpp"
#include "voipsim/traffic.hpp"
#include "voipsim/util.hpp"
