#pragma once

#include "radv/errors.hpp"
#include "radv/random.hpp"
#include "radv/recognition_curve.hpp"
#include "radv/core_game.hpp"
#include "radv/stopping.hpp"
#include "radv/dynamic_adversary.hpp"
#include "radv/shape.hpp"
#include "radv/reference_payoff.hpp"
#include "radv/mass_dynamics.hpp"
#include "radv/parallel.hpp"
#include "radv/result_table.hpp"
#include "radv/scenario.hpp"
#include "radv/commands.hpp"
