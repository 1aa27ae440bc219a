#pragma once

#include "ptspectra/airy.hpp"
#include "ptspectra/linear_model.hpp"
#include "ptspectra/model.hpp"
#include "ptspectra/path.hpp"
#include "ptspectra/report/bundle.hpp"
#include "ptspectra/report/config.hpp"
#include "ptspectra/report/figures.hpp"
#include "ptspectra/report/runner.hpp"
#include "ptspectra/report/svg.hpp"
#include "ptspectra/rk.hpp"
#include "ptspectra/roots.hpp"
#include "ptspectra/scaling_graph.hpp"
#include "ptspectra/secular.hpp"
#include "ptspectra/shooting.hpp"
#include "ptspectra/stokes.hpp"
