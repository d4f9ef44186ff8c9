#pragma once

#include "slabrt/dispersion.hpp"
#include "slabrt/errors.hpp"
#include "slabrt/evolve.hpp"
#include "slabrt/forms.hpp"
#include "slabrt/grid.hpp"
#include "slabrt/profile.hpp"
#include "slabrt/variational.hpp"
