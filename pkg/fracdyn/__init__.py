##
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
##

version = '1.0.0'
version_date = '2026-10-17'

# Try to get version from the installed distribution metadata
try:
    from importlib.metadata import version as _distribution_version
    version = _distribution_version("fracdyn")
except Exception:
    pass
