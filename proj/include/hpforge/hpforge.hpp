#pragma once

// Umbrella header: finite fields, projective spaces, higgledy-piggledy
// verification, constructions, searches, codes, resolving sets, JSON I/O.

#include "hpforge/common.hpp"
#include "hpforge/fields.hpp"
#include "hpforge/linalg.hpp"
#include "hpforge/projective.hpp"
#include "hpforge/verify.hpp"
#include "hpforge/construct.hpp"
#include "hpforge/search.hpp"
#include "hpforge/codes.hpp"
#include "hpforge/resolving.hpp"
#include "hpforge/io.hpp"
