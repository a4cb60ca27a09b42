#pragma once

#include "cfprod/abgroup.hpp"
#include "cfprod/catalog.hpp"
#include "cfprod/error.hpp"
#include "cfprod/fusion.hpp"
#include "cfprod/intmat.hpp"
#include "cfprod/io.hpp"
#include "cfprod/metric.hpp"
#include "cfprod/phase.hpp"
#include "cfprod/pointed.hpp"
#include "cfprod/verify.hpp"
#include "cfprod/zest.hpp"
