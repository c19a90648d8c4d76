// Copyright 2026 The bellsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BELLSIM_BELLSIM_HPP
#define BELLSIM_BELLSIM_HPP

#include "bellsim/angle.hpp"
#include "bellsim/experiment.hpp"
#include "bellsim/inequality.hpp"
#include "bellsim/lhv.hpp"
#include "bellsim/optimize.hpp"
#include "bellsim/philox.hpp"
#include "bellsim/quantum.hpp"

#endif  // BELLSIM_BELLSIM_HPP
