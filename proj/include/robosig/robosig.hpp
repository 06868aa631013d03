#pragma once

#include "robosig/errors.hpp"
#include "robosig/eval.hpp"
#include "robosig/features.hpp"
#include "robosig/ingest.hpp"
#include "robosig/matchers.hpp"
#include "robosig/pipeline.hpp"
#include "robosig/robot2d.hpp"
#include "robosig/robot3d.hpp"
#include "robosig/synth.hpp"
