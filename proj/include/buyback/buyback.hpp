#ifndef BUYBACK_BUYBACK_HPP
#define BUYBACK_BUYBACK_HPP

#include "buyback/errors.hpp"
#include "buyback/rational.hpp"
#include "buyback/matroid.hpp"
#include "buyback/ratio.hpp"
#include "buyback/instance.hpp"
#include "buyback/engine.hpp"
#include "buyback/offline.hpp"
#include "buyback/bipartite_matching.hpp"
#include "buyback/charge_auditor.hpp"
#include "buyback/adversary.hpp"
#include "buyback/generator.hpp"
#include "buyback/batch.hpp"
#include "buyback/json_io.hpp"

#endif  // BUYBACK_BUYBACK_HPP
