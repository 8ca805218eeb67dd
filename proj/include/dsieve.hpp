/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DSIEVE_DSIEVE_HPP
#define DSIEVE_DSIEVE_HPP

#include "dsieve/cli.hpp"
#include "dsieve/config.hpp"
#include "dsieve/dyadic.hpp"
#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/parallel.hpp"
#include "dsieve/params.hpp"
#include "dsieve/report.hpp"
#include "dsieve/sequence.hpp"
#include "dsieve/sieve.hpp"
#include "dsieve/validate.hpp"
#include "dsieve/witness.hpp"

#endif  // DSIEVE_DSIEVE_HPP
