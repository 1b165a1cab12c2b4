#pragma once

#include "rhythm/collective.hpp"
#include "rhythm/error.hpp"
#include "rhythm/ingest.hpp"
#include "rhythm/oracle.hpp"
#include "rhythm/pcmatrix.hpp"
#include "rhythm/report.hpp"
#include "rhythm/rhythm.hpp"
