#pragma once

#include "germkit/errors.hpp"
#include "germkit/polynomial.hpp"
#include "germkit/matrix.hpp"
#include "germkit/map_germ.hpp"
#include "germkit/lipschitz.hpp"
#include "germkit/parse.hpp"
#include "germkit/invariants.hpp"
#include "germkit/boardman.hpp"
#include "germkit/equivlab.hpp"
#include "germkit/tangent.hpp"
#include "germkit/puiseux.hpp"
#include "germkit/presets.hpp"
#include "germkit/report.hpp"
