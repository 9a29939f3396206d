#pragma once

#include "idnc/clique.hpp"
#include "idnc/graph.hpp"
#include "idnc/model.hpp"
#include "idnc/policies.hpp"
#include "idnc/random.hpp"
#include "idnc/simulator.hpp"
#include "idnc/sweep.hpp"
#include "idnc/version.hpp"
