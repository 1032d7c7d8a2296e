#pragma once

#include "fbms/mesh.hpp"
#include "fbms/geometry.hpp"
#include "fbms/generators.hpp"
#include "fbms/solver.hpp"
#include "fbms/radial_graph.hpp"
#include "fbms/steklov.hpp"
#include "fbms/pipeline.hpp"
