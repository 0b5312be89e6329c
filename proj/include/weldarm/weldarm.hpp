#pragma once

#include "weldarm/angles.hpp"
#include "weldarm/collision.hpp"
#include "weldarm/dynamics.hpp"
#include "weldarm/errors.hpp"
#include "weldarm/ik.hpp"
#include "weldarm/kinematics.hpp"
#include "weldarm/model.hpp"
#include "weldarm/output.hpp"
#include "weldarm/pathplan.hpp"
#include "weldarm/sim.hpp"
