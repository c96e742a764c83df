#pragma once

#include "ddsm/common.hpp"
#include "ddsm/objective.hpp"
#include "ddsm/steps.hpp"
#include "ddsm/engine.hpp"
#include "ddsm/analysis.hpp"
#include "ddsm/trace_io.hpp"
#include "ddsm/config_file.hpp"
