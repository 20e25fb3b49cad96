#pragma once

#include "bbcode/poly.hpp"
#include "bbcode/factor.hpp"
#include "bbcode/ring.hpp"
#include "bbcode/linalg.hpp"
#include "bbcode/dimension.hpp"
#include "bbcode/distance.hpp"
#include "bbcode/search.hpp"
