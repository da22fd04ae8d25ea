/*
 *  Copyright 2026 The symdisc Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#pragma once

#include "symdisc/cx_poly.hpp"
#include "symdisc/config.hpp"
#include "symdisc/domain_gn.hpp"
#include "symdisc/lower_bounds.hpp"
#include "symdisc/pick.hpp"
#include "symdisc/disc_upper.hpp"
#include "symdisc/io.hpp"
#include "symdisc/experiments.hpp"
#include "symdisc/parse.hpp"
