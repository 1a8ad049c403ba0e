#pragma once

#include "godbersen/check_report.hpp"
#include "godbersen/error.hpp"
#include "godbersen/experiment.hpp"
#include "godbersen/functional.hpp"
#include "godbersen/hrep.hpp"
#include "godbersen/hull.hpp"
#include "godbersen/io.hpp"
#include "godbersen/lp.hpp"
#include "godbersen/mixed_volume.hpp"
#include "godbersen/planar.hpp"
#include "godbersen/polytope.hpp"
#include "godbersen/random.hpp"
#include "godbersen/rs_bodies.hpp"
#include "godbersen/scalar.hpp"
#include "godbersen/simplex.hpp"
#include "godbersen/translation.hpp"
