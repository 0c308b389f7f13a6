# Copyright 2026 The spikets Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds tests/data/Tiny.zip, a small archive laid out like the UEA zips.

    python tools/oracles/make_fixture_zip.py tests/data/Tiny.zip
"""

import sys
import zipfile

HEADER = """@problemName Tiny
@timeStamps false
@missing false
@univariate false
@dimensions 2
@equalLength true
@seriesLength 5
@classLabel true a b
@data
"""

TRAIN = [
    ("0.1,0.2,0.3,0.4,0.5", "1,1,1,1,1", "a"),
    ("0.5,0.4,0.3,0.2,0.1", "2,2,2,2,2", "b"),
    ("0.2,0.2,0.3,0.4,0.6", "1,0.9,1,1.1,1", "a"),
    ("0.6,0.4,0.3,0.2,0.0", "2,2.1,2,1.9,2", "b"),
]
TEST = [
    ("0.1,0.3,0.3,0.4,0.5", "1,1,1.2,1,1", "a"),
    ("0.5,0.4,0.2,0.2,0.1", "2,2,2,2.2,2", "b"),
]


def body(rows):
    return HEADER + "".join(f"{x}:{y}:{label}\n" for x, y, label in rows)


def main(path):
    with zipfile.ZipFile(path, "w") as z:
        # One stored and one deflated member so both code paths get exercised.
        z.writestr("Tiny/Tiny_TRAIN.ts", body(TRAIN), compress_type=zipfile.ZIP_DEFLATED)
        z.writestr("Tiny/Tiny_TEST.ts", body(TEST), compress_type=zipfile.ZIP_STORED)


if __name__ == "__main__":
    main(sys.argv[1])
