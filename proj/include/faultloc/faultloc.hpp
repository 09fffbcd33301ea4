#pragma once

#include "ast.hpp"
#include "bitblast.hpp"
#include "diagnose.hpp"
#include "errors.hpp"
#include "exec.hpp"
#include "maxsat.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "report.hpp"
#include "sat.hpp"
#include "ssa.hpp"
#include "test_suite.hpp"
#include "transform.hpp"
#include "wcnf.hpp"
#include "weights.hpp"
