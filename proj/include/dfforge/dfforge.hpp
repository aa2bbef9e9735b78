#pragma once

#include "dfforge/abel.hpp"
#include "dfforge/coefficient.hpp"
#include "dfforge/config.hpp"
#include "dfforge/contour.hpp"
#include "dfforge/df.hpp"
#include "dfforge/error.hpp"
#include "dfforge/model.hpp"
#include "dfforge/model_io.hpp"
#include "dfforge/models.hpp"
#include "dfforge/moments.hpp"
#include "dfforge/quadrature.hpp"
#include "dfforge/special.hpp"
#include "dfforge/synthesis.hpp"
#include "dfforge/velocity.hpp"
#include "dfforge/verify.hpp"
