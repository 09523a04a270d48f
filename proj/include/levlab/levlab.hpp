#pragma once

#include "levlab/arith.hpp"
#include "levlab/bound.hpp"
#include "levlab/characters.hpp"
#include "levlab/constants.hpp"
#include "levlab/error.hpp"
#include "levlab/lfunction.hpp"
#include "levlab/mollifier.hpp"
#include "levlab/moments.hpp"
#include "levlab/nelder_mead.hpp"
#include "levlab/parallel.hpp"
#include "levlab/special.hpp"
#include "levlab/version.hpp"
#include "levlab/zeros.hpp"
