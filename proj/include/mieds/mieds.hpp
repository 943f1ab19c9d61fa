#pragma once

#include "mieds/encoder.hpp"
#include "mieds/error.hpp"
#include "mieds/etse.hpp"
#include "mieds/expr.hpp"
#include "mieds/integrate.hpp"
#include "mieds/io.hpp"
#include "mieds/parser.hpp"
#include "mieds/systems.hpp"
#include "mieds/taylor.hpp"
