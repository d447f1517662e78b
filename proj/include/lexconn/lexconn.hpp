#ifndef LEXCONN_LEXCONN_HPP
#define LEXCONN_LEXCONN_HPP

#include "bounds.hpp"
#include "connectivity.hpp"
#include "construct.hpp"
#include "corpus.hpp"
#include "dot.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "steiner.hpp"

#endif // LEXCONN_LEXCONN_HPP
