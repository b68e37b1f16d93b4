#ifndef WORMSZEGO_WORMSZEGO_HPP
#define WORMSZEGO_WORMSZEGO_HPP

#include "wormszego/analysis.hpp"
#include "wormszego/domain.hpp"
#include "wormszego/errors.hpp"
#include "wormszego/fit.hpp"
#include "wormszego/kernel_terms.hpp"
#include "wormszego/quadrature.hpp"
#include "wormszego/reproducing.hpp"
#include "wormszego/rng.hpp"
#include "wormszego/series.hpp"
#include "wormszego/szego.hpp"

#endif
