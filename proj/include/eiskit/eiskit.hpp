#pragma once

// Umbrella header.

#include "eiskit/diagnostics.hpp"
#include "eiskit/export.hpp"
#include "eiskit/formula.hpp"
#include "eiskit/json_io.hpp"
#include "eiskit/model.hpp"
#include "eiskit/parse.hpp"
#include "eiskit/proof.hpp"
#include "eiskit/system.hpp"
#include "eiskit/term.hpp"
