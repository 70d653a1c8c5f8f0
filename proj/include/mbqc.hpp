#pragma once

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/gadgets.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/grover.hpp"
#include "mbqc/histogram.hpp"
#include "mbqc/io.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/simulator.hpp"
#include "mbqc/state_vector.hpp"
#include "mbqc/ubqc.hpp"
#include "mbqc/verify.hpp"
