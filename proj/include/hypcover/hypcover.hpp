#pragma once

#include "hypcover/error.hpp"
#include "hypcover/hypgeo.hpp"
#include "hypcover/polygon.hpp"
#include "hypcover/quadrature.hpp"
#include "hypcover/surd.hpp"
#include "hypcover/precision.hpp"
#include "hypcover/fundpoly.hpp"
#include "hypcover/paint.hpp"
#include "hypcover/packets.hpp"
#include "hypcover/equih.hpp"
#include "hypcover/bgraph.hpp"
#include "hypcover/io.hpp"
