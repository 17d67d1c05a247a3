/*
 * Copyright 2026 The semisparse Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#include <semisparse/io.h>
#include <semisparse/solver.h>

#include <ostream>

namespace semisparse {

void write_diagnostics_csv(std::ostream& out, const Diagnostics<double>& diagnostics)
{
    out << "iter,energy,r_P,r_Q,dN,seconds\n";
    for (const auto& r : diagnostics.records) {
        out << r.iter << ',' << format_double(r.energy) << ',' << format_double(r.r_P) << ','
            << format_double(r.r_Q) << ',' << format_double(r.dN) << ',' << format_double(r.seconds)
            << '\n';
    }
}

} // namespace semisparse
