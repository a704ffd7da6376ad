#pragma once

#include "eiscong/error.hpp"
#include "eiscong/arith.hpp"
#include "eiscong/matrix.hpp"
#include "eiscong/field.hpp"
#include "eiscong/ideal.hpp"
#include "eiscong/abelian.hpp"
#include "eiscong/classgroup.hpp"
#include "eiscong/rayclass.hpp"
#include "eiscong/cyclotomic.hpp"
#include "eiscong/character.hpp"
#include "eiscong/bernoulli.hpp"
#include "eiscong/lvalue.hpp"
#include "eiscong/cusp.hpp"
#include "eiscong/eisenstein.hpp"
#include "eiscong/finite_field.hpp"
#include "eiscong/congruence.hpp"
#include "eiscong/io.hpp"
