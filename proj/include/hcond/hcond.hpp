#pragma once

#include "hcond/bipartite.hpp"
#include "hcond/cnf.hpp"
#include "hcond/condense.hpp"
#include "hcond/dag.hpp"
#include "hcond/dimacs.hpp"
#include "hcond/error.hpp"
#include "hcond/expander.hpp"
#include "hcond/gf2.hpp"
#include "hcond/oracles.hpp"
#include "hcond/proof.hpp"
#include "hcond/transform.hpp"
#include "hcond/xorify.hpp"
