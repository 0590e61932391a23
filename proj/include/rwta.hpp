#ifndef RWTA_HPP
#define RWTA_HPP

#include "rwta/analysis.hpp"
#include "rwta/checks.hpp"
#include "rwta/automaton.hpp"
#include "rwta/constructions.hpp"
#include "rwta/dump.hpp"
#include "rwta/error.hpp"
#include "rwta/indexed.hpp"
#include "rwta/kernel.hpp"
#include "rwta/language.hpp"
#include "rwta/random.hpp"
#include "rwta/series.hpp"
#include "rwta/subset.hpp"
#include "rwta/subtree_automata.hpp"
#include "rwta/term_io.hpp"
#include "rwta/tree.hpp"
#include "rwta/weight.hpp"

#endif  // RWTA_HPP
