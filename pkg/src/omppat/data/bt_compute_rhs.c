/* BT right-hand side: one parallel region, worksharing on j inside serial k sweeps. */
#include <stdio.h>

#define N 12
#define NC 5

double u[N][N][N][NC];
double rhs[N][N][N][NC];
double forcing[N][N][N][NC];
double rho_i[N][N][N];
double us[N][N][N];
double vs[N][N][N];
double ws[N][N][N];
double qs[N][N][N];
double square[N][N][N];

double dt = 0.0008;
double tx2 = 0.25;
double ty2 = 0.25;
double tz2 = 0.25;
double dssp = 0.02;

void compute_rhs(void)
{
  int i, j, k, m;
  double rho_inv, uijk, up1, um1, vijk, vp1, vm1, wijk, wp1, wm1;

#pragma omp parallel default(shared) private(i, j, k, m, rho_inv, uijk, up1, um1, vijk, vp1, vm1, wijk, wp1, wm1)
  {
    for (k = 0; k < N; k++) {
#pragma omp for nowait
      for (j = 0; j < N; j++) {
        for (i = 0; i < N; i++) {
          rho_inv = 1.0 / u[k][j][i][0];
          rho_i[k][j][i] = rho_inv;
          us[k][j][i] = u[k][j][i][1] * rho_inv;
          vs[k][j][i] = u[k][j][i][2] * rho_inv;
          ws[k][j][i] = u[k][j][i][3] * rho_inv;
          square[k][j][i] = 0.5 * (u[k][j][i][1] * u[k][j][i][1] + u[k][j][i][2] * u[k][j][i][2] + u[k][j][i][3] * u[k][j][i][3]) * rho_inv;
          qs[k][j][i] = square[k][j][i] * rho_inv;
        }
      }
    }

    for (k = 0; k < N; k++) {
#pragma omp for
      for (j = 0; j < N; j++) {
        for (i = 0; i < N; i++) {
          for (m = 0; m < NC; m++) {
            rhs[k][j][i][m] = forcing[k][j][i][m];
          }
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          uijk = us[k][j][i];
          up1 = us[k][j][i + 1];
          um1 = us[k][j][i - 1];
          rhs[k][j][i][0] = rhs[k][j][i][0] - tx2 * (u[k][j][i + 1][1] - u[k][j][i - 1][1]);
          rhs[k][j][i][1] = rhs[k][j][i][1] - tx2 * (u[k][j][i + 1][1] * up1 - u[k][j][i - 1][1] * um1 + (u[k][j][i + 1][4] - square[k][j][i + 1] - u[k][j][i - 1][4] + square[k][j][i - 1]) * 0.4);
          rhs[k][j][i][2] = rhs[k][j][i][2] - tx2 * (u[k][j][i + 1][2] * up1 - u[k][j][i - 1][2] * um1);
          rhs[k][j][i][3] = rhs[k][j][i][3] - tx2 * (u[k][j][i + 1][3] * up1 - u[k][j][i - 1][3] * um1);
          rhs[k][j][i][4] = rhs[k][j][i][4] + uijk * 0.01;
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (i = 2; i < N - 2; i++) {
          for (m = 0; m < NC; m++) {
            rhs[k][j][i][m] = rhs[k][j][i][m] - dssp * (u[k][j][i - 2][m] - 4.0 * u[k][j][i - 1][m] + 6.0 * u[k][j][i][m] - 4.0 * u[k][j][i + 1][m] + u[k][j][i + 2][m]);
          }
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          vijk = vs[k][j][i];
          vp1 = vs[k][j + 1][i];
          vm1 = vs[k][j - 1][i];
          rhs[k][j][i][0] = rhs[k][j][i][0] - ty2 * (u[k][j + 1][i][2] - u[k][j - 1][i][2]);
          rhs[k][j][i][1] = rhs[k][j][i][1] - ty2 * (u[k][j + 1][i][1] * vp1 - u[k][j - 1][i][1] * vm1);
          rhs[k][j][i][2] = rhs[k][j][i][2] - ty2 * (u[k][j + 1][i][2] * vp1 - u[k][j - 1][i][2] * vm1 + (u[k][j + 1][i][4] - square[k][j + 1][i] - u[k][j - 1][i][4] + square[k][j - 1][i]) * 0.4);
          rhs[k][j][i][3] = rhs[k][j][i][3] - ty2 * (u[k][j + 1][i][3] * vp1 - u[k][j - 1][i][3] * vm1);
          rhs[k][j][i][4] = rhs[k][j][i][4] + vijk * 0.01;
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for
      for (j = 2; j < N - 2; j++) {
        for (i = 1; i < N - 1; i++) {
          for (m = 0; m < NC; m++) {
            rhs[k][j][i][m] = rhs[k][j][i][m] - dssp * (u[k][j - 2][i][m] - 4.0 * u[k][j - 1][i][m] + 6.0 * u[k][j][i][m] - 4.0 * u[k][j + 1][i][m] + u[k][j + 2][i][m]);
          }
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          wijk = ws[k][j][i];
          wp1 = ws[k + 1][j][i];
          wm1 = ws[k - 1][j][i];
          rhs[k][j][i][0] = rhs[k][j][i][0] - tz2 * (u[k + 1][j][i][3] - u[k - 1][j][i][3]);
          rhs[k][j][i][1] = rhs[k][j][i][1] - tz2 * (u[k + 1][j][i][1] * wp1 - u[k - 1][j][i][1] * wm1);
          rhs[k][j][i][2] = rhs[k][j][i][2] - tz2 * (u[k + 1][j][i][2] * wp1 - u[k - 1][j][i][2] * wm1);
          rhs[k][j][i][3] = rhs[k][j][i][3] - tz2 * (u[k + 1][j][i][3] * wp1 - u[k - 1][j][i][3] * wm1 + (u[k + 1][j][i][4] - square[k + 1][j][i] - u[k - 1][j][i][4] + square[k - 1][j][i]) * 0.4);
          rhs[k][j][i][4] = rhs[k][j][i][4] + wijk * 0.01;
        }
      }
    }

    for (k = 2; k < N - 2; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          for (m = 0; m < NC; m++) {
            rhs[k][j][i][m] = rhs[k][j][i][m] - dssp * (u[k - 2][j][i][m] - 4.0 * u[k - 1][j][i][m] + 6.0 * u[k][j][i][m] - 4.0 * u[k + 1][j][i][m] + u[k + 2][j][i][m]);
          }
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (m = 0; m < NC; m++) {
          rhs[k][j][1][m] = rhs[k][j][1][m] - dssp * (5.0 * u[k][j][1][m] - 4.0 * u[k][j][2][m] + u[k][j][3][m]);
          rhs[k][j][N - 2][m] = rhs[k][j][N - 2][m] - dssp * (u[k][j][N - 4][m] - 4.0 * u[k][j][N - 3][m] + 5.0 * u[k][j][N - 2][m]);
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for nowait
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          for (m = 0; m < NC; m++) {
            rhs[k][j][i][m] = rhs[k][j][i][m] * dt;
          }
        }
      }
    }

    for (k = 1; k < N - 1; k++) {
#pragma omp for
      for (j = 1; j < N - 1; j++) {
        for (i = 1; i < N - 1; i++) {
          rhs[k][j][i][4] = rhs[k][j][i][4] + rho_i[k][j][i] * qs[k][j][i] * dt;
        }
      }
    }
  }
}

int main(void)
{
  int i, j, k, m;
  double sum = 0.0;

  for (k = 0; k < N; k++) {
    for (j = 0; j < N; j++) {
      for (i = 0; i < N; i++) {
        for (m = 0; m < NC; m++) {
          u[k][j][i][m] = 1.0 + 0.01 * (i + 2 * j + 3 * k + m);
          forcing[k][j][i][m] = 0.001 * ((i * j + k * m) % 7);
        }
      }
    }
  }
  compute_rhs();
  for (k = 0; k < N; k++) {
    for (j = 0; j < N; j++) {
      for (i = 0; i < N; i++) {
        for (m = 0; m < NC; m++) {
          sum = sum + rhs[k][j][i][m] * (1.0 + 0.001 * m);
        }
      }
    }
  }
  printf("checksum = %.12e\n", sum);
  return 0;
}
