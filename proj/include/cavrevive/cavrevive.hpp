// cavrevive.hpp — Umbrella header for the Tavis–Cummings collapse/revival library

#pragma once

#include "cavrevive/attractor.hpp"
#include "cavrevive/engine.hpp"
#include "cavrevive/errors.hpp"
#include "cavrevive/hilbert.hpp"
#include "cavrevive/observables.hpp"
#include "cavrevive/oracle.hpp"
#include "cavrevive/phase_space.hpp"
#include "cavrevive/scenario.hpp"
#include "cavrevive/verify.hpp"
