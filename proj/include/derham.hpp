#pragma once

#include "derham/config.hpp"
#include "derham/derham.hpp"
#include "derham/dmodrep.hpp"
#include "derham/error.hpp"
#include "derham/harness.hpp"
#include "derham/ideal.hpp"
#include "derham/linalg.hpp"
#include "derham/poly.hpp"
#include "derham/rational.hpp"
#include "derham/report.hpp"
#include "derham/sample.hpp"
#include "derham/selftest.hpp"
#include "derham/syntax.hpp"
#include "derham/weyl.hpp"
