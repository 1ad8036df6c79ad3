#pragma once

#include "pplab/error.hpp"
#include "pplab/rational.hpp"
#include "pplab/interval.hpp"
#include "pplab/certified_real.hpp"
#include "pplab/pseudopoly.hpp"
#include "pplab/exponents.hpp"
#include "pplab/arith.hpp"
#include "pplab/heath_brown.hpp"
#include "pplab/parallel.hpp"
#include "pplab/dioph.hpp"
#include "pplab/expsum.hpp"
#include "pplab/experiments.hpp"
#include "pplab/cli.hpp"
