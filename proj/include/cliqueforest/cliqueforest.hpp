#pragma once

#include "cliqueforest/alphas.hpp"
#include "cliqueforest/clique_forest.hpp"
#include "cliqueforest/commutation_graph.hpp"
#include "cliqueforest/diffeo.hpp"
#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/embedding.hpp"
#include "cliqueforest/embedding_io.hpp"
#include "cliqueforest/errors.hpp"
#include "cliqueforest/expr_io.hpp"
#include "cliqueforest/graph.hpp"
#include "cliqueforest/manifold.hpp"
#include "cliqueforest/obstructions/heisenberg.hpp"
#include "cliqueforest/obstructions/oracle.hpp"
#include "cliqueforest/obstructions/quadruple.hpp"
#include "cliqueforest/obstructions/remark.hpp"
#include "cliqueforest/parallel.hpp"
#include "cliqueforest/raag_word.hpp"
#include "cliqueforest/synthesis.hpp"
#include "cliqueforest/words.hpp"
