#pragma once

#include "kfsm/circlemap.hpp"
#include "kfsm/errors.hpp"
#include "kfsm/hm.hpp"
#include "kfsm/interp.hpp"
#include "kfsm/io.hpp"
#include "kfsm/rational.hpp"
#include "kfsm/word.hpp"
