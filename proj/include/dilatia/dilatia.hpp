#pragma once

#include "dilatia/error.hpp"
#include "dilatia/random.hpp"
#include "dilatia/tolerance.hpp"
#include "dilatia/report.hpp"
#include "dilatia/space.hpp"
#include "dilatia/metric_core.hpp"
#include "dilatia/index_set.hpp"
#include "dilatia/dilation_family.hpp"
#include "dilatia/cone.hpp"
#include "dilatia/radial.hpp"
#include "dilatia/derived_metrics.hpp"
#include "dilatia/gallery.hpp"
#include "dilatia/spec_io.hpp"
