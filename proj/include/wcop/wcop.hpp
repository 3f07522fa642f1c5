#pragma once

#include "wcop/error.hpp"
#include "wcop/series.hpp"
#include "wcop/rotation.hpp"
#include "wcop/weight.hpp"
#include "wcop/weighted_op.hpp"
#include "wcop/resolvent.hpp"
#include "wcop/jensen.hpp"
#include "wcop/classifier.hpp"
#include "wcop/conjugation.hpp"
#include "wcop/parallel.hpp"
