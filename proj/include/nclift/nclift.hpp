#pragma once

#include "nclift/acceptance.hpp"
#include "nclift/automaton.hpp"
#include "nclift/circuit.hpp"
#include "nclift/errors.hpp"
#include "nclift/hadamard.hpp"
#include "nclift/lift.hpp"
#include "nclift/matrix.hpp"
#include "nclift/polynomial.hpp"
#include "nclift/random_circuit.hpp"
#include "nclift/scalar.hpp"
#include "nclift/text_format.hpp"
#include "nclift/verify.hpp"
#include "nclift/word.hpp"
