#ifndef AIRYLAB_AIRYLAB_HPP
#define AIRYLAB_AIRYLAB_HPP

#include "bubbles.hpp"
#include "error.hpp"
#include "extremal.hpp"
#include "fft.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "norms.hpp"
#include "refined.hpp"
#include "separation.hpp"
#include "spectral.hpp"

#endif
