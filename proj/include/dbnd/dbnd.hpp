#pragma once

// Everything: bisets, instances, the LP engine, iterative rounding, the
// laminar analysis, the k-connectivity pipeline, the verifier and file I/O.

#include "dbnd/biset.hpp"
#include "dbnd/connectivity.hpp"
#include "dbnd/connectivity_function.hpp"
#include "dbnd/cutting_plane.hpp"
#include "dbnd/driver.hpp"
#include "dbnd/error.hpp"
#include "dbnd/instance.hpp"
#include "dbnd/io.hpp"
#include "dbnd/iterative_rounding.hpp"
#include "dbnd/kconn_pipeline.hpp"
#include "dbnd/laminar_analysis.hpp"
#include "dbnd/max_flow.hpp"
#include "dbnd/rational.hpp"
#include "dbnd/separation.hpp"
#include "dbnd/simplex.hpp"
#include "dbnd/verify.hpp"
