#pragma once

#include "mixmax/bounds.hpp"
#include "mixmax/dist.hpp"
#include "mixmax/enclosure.hpp"
#include "mixmax/error.hpp"
#include "mixmax/extremal.hpp"
#include "mixmax/io.hpp"
#include "mixmax/oracle.hpp"
#include "mixmax/rational.hpp"
#include "mixmax/transforms.hpp"
