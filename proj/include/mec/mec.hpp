#pragma once

#include "mec/coupling.hpp"
#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/greedy.hpp"
#include "mec/instance.hpp"
#include "mec/io.hpp"
#include "mec/majorization.hpp"
#include "mec/majorizing_set.hpp"
#include "mec/numeric.hpp"
#include "mec/oracle.hpp"
#include "mec/random.hpp"
#include "mec/split.hpp"
#include "mec/verify.hpp"
