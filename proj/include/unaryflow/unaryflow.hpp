#pragma once

#include "unaryflow/bench.hpp"
#include "unaryflow/costmodel.hpp"
#include "unaryflow/detmul.hpp"
#include "unaryflow/funcs.hpp"
#include "unaryflow/matrix.hpp"
#include "unaryflow/streams.hpp"
