#pragma once

#include "framekernel/classic.hpp"
#include "framekernel/error.hpp"
#include "framekernel/frame_core.hpp"
#include "framekernel/gp_kl.hpp"
#include "framekernel/random.hpp"
#include "framekernel/rkhs.hpp"
#include "framekernel/spectral.hpp"
