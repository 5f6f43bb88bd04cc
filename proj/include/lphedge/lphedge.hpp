#ifndef LPHEDGE_LPHEDGE_HPP
#define LPHEDGE_LPHEDGE_HPP

#include "chain.hpp"
#include "chain_json.hpp"
#include "config.hpp"
#include "cpmm.hpp"
#include "errors.hpp"
#include "il.hpp"
#include "oracle.hpp"
#include "replication.hpp"
#include "report_json.hpp"
#include "strangle.hpp"

#endif // LPHEDGE_LPHEDGE_HPP
