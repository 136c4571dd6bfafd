#pragma once

#include "torsio/cli.hpp"
#include "torsio/common.hpp"
#include "torsio/complexes.hpp"
#include "torsio/geometry.hpp"
#include "torsio/gluing.hpp"
#include "torsio/grassmann.hpp"
#include "torsio/io.hpp"
#include "torsio/rigidity.hpp"
#include "torsio/triangulation.hpp"
#include "torsio/verification.hpp"
