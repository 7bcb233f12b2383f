// Copyright 2026 The frcopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Compiles the public header as C and exercises the handle lifecycle. */
#include "frc/frc.h"

#include <stdio.h>
#include <string.h>

int main(void) {
  frc_config* cfg = NULL;
  char* dir = NULL;
  if (strlen(frc_version()) == 0) return 1;
  if (frc_config_default("michell_half", &cfg) != FRC_OK) return 1;
  if (frc_config_set_output_dir(cfg, "c_out") != FRC_OK) return 1;
  if (frc_config_output_dir(cfg, &dir) != FRC_OK || strcmp(dir, "c_out") != 0) return 1;
  frc_string_free(dir);
  if (frc_config_override(cfg, "no_such_key=1") != FRC_ERR_CONFIG) return 1;
  if (strstr(frc_last_error(), "no_such_key") == NULL) return 1;
  frc_config_destroy(cfg);
  frc_config_destroy(NULL);
  puts("ok");
  return 0;
}
