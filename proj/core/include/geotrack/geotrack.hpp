#pragma once

#include "geotrack/analysis.hpp"
#include "geotrack/basis.hpp"
#include "geotrack/cli.hpp"
#include "geotrack/config.hpp"
#include "geotrack/errors.hpp"
#include "geotrack/group.hpp"
#include "geotrack/integrate.hpp"
#include "geotrack/numeric.hpp"
#include "geotrack/reference.hpp"
#include "geotrack/rng.hpp"
#include "geotrack/system.hpp"
#include "geotrack/tracking.hpp"
#include "geotrack/verify.hpp"
