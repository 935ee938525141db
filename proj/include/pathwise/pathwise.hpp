#pragma once

#include "pathwise/catalog.hpp"
#include "pathwise/constructors.hpp"
#include "pathwise/dyadic.hpp"
#include "pathwise/error.hpp"
#include "pathwise/expression.hpp"
#include "pathwise/faber_schauder.hpp"
#include "pathwise/flow.hpp"
#include "pathwise/follmer.hpp"
#include "pathwise/ide.hpp"
#include "pathwise/io.hpp"
#include "pathwise/ode.hpp"
#include "pathwise/quadvar.hpp"
#include "pathwise/support.hpp"
