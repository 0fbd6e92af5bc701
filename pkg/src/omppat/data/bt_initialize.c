/* BT field initialization: interior from the exact solution, then the six faces. */
#include <stdio.h>

#define N 12
#define NC 5

double u[N][N][N][NC];
double ce[NC][7];
double dnxm1 = 1.0 / (N - 1);
double dnym1 = 1.0 / (N - 1);
double dnzm1 = 1.0 / (N - 1);

void exact_solution(double xi, double eta, double zeta, double dtemp[NC])
{
  int m;

  for (m = 0; m < NC; m++) {
    dtemp[m] = ce[m][0] + xi * (ce[m][1] + xi * ce[m][4]) + eta * (ce[m][2] + eta * ce[m][5]) + zeta * (ce[m][3] + zeta * ce[m][6]);
  }
}

void initialize(void)
{
  int i, j, k, m, ix, iy, iz;
  double xi, eta, zeta, Pxi, Peta, Pzeta;
  double Pface[2][3][NC], temp[NC];

#pragma omp parallel default(shared) private(i, j, k, m, ix, iy, iz, xi, eta, zeta, Pxi, Peta, Pzeta, Pface, temp)
  {
#pragma omp for nowait
    for (k = 0; k < N; k++) {
      for (j = 0; j < N; j++) {
        for (i = 0; i < N; i++) {
          for (m = 0; m < NC; m++) {
            u[k][j][i][m] = 1.0;
          }
        }
      }
    }

#pragma omp for nowait
    for (k = 0; k < N; k++) {
      zeta = k * dnzm1;
      for (j = 0; j < N; j++) {
        eta = j * dnym1;
        for (i = 0; i < N; i++) {
          xi = i * dnxm1;
          for (ix = 0; ix < 2; ix++) {
            exact_solution(ix, eta, zeta, &Pface[ix][0][0]);
          }
          for (iy = 0; iy < 2; iy++) {
            exact_solution(xi, iy, zeta, &Pface[iy][1][0]);
          }
          for (iz = 0; iz < 2; iz++) {
            exact_solution(xi, eta, iz, &Pface[iz][2][0]);
          }
          for (m = 0; m < NC; m++) {
            Pxi = xi * Pface[1][0][m] + (1.0 - xi) * Pface[0][0][m];
            Peta = eta * Pface[1][1][m] + (1.0 - eta) * Pface[0][1][m];
            Pzeta = zeta * Pface[1][2][m] + (1.0 - zeta) * Pface[0][2][m];
            u[k][j][i][m] = Pxi + Peta + Pzeta - Pxi * Peta - Pxi * Pzeta - Peta * Pzeta + Pxi * Peta * Pzeta;
          }
        }
      }
    }

#pragma omp for nowait
    for (k = 0; k < N; k++) {
      zeta = k * dnzm1;
      for (j = 0; j < N; j++) {
        eta = j * dnym1;
        exact_solution(0.0, eta, zeta, temp);
        for (m = 0; m < NC; m++) {
          u[k][j][0][m] = temp[m];
        }
      }
    }

#pragma omp for nowait
    for (k = 0; k < N; k++) {
      zeta = k * dnzm1;
      for (j = 0; j < N; j++) {
        eta = j * dnym1;
        exact_solution(1.0, eta, zeta, temp);
        for (m = 0; m < NC; m++) {
          u[k][j][N - 1][m] = temp[m];
        }
      }
    }

#pragma omp for nowait
    for (k = 0; k < N; k++) {
      zeta = k * dnzm1;
      for (i = 0; i < N; i++) {
        xi = i * dnxm1;
        exact_solution(xi, 0.0, zeta, temp);
        for (m = 0; m < NC; m++) {
          u[k][0][i][m] = temp[m];
        }
      }
    }

#pragma omp for
    for (k = 0; k < N; k++) {
      zeta = k * dnzm1;
      for (i = 0; i < N; i++) {
        xi = i * dnxm1;
        exact_solution(xi, 1.0, zeta, temp);
        for (m = 0; m < NC; m++) {
          u[k][N - 1][i][m] = temp[m];
        }
      }
    }

#pragma omp for nowait
    for (j = 0; j < N; j++) {
      eta = j * dnym1;
      for (i = 0; i < N; i++) {
        xi = i * dnxm1;
        exact_solution(xi, eta, 0.0, temp);
        for (m = 0; m < NC; m++) {
          u[0][j][i][m] = temp[m];
        }
      }
    }

#pragma omp for
    for (j = 0; j < N; j++) {
      eta = j * dnym1;
      for (i = 0; i < N; i++) {
        xi = i * dnxm1;
        exact_solution(xi, eta, 1.0, temp);
        for (m = 0; m < NC; m++) {
          u[N - 1][j][i][m] = temp[m];
        }
      }
    }
  }
}

int main(void)
{
  int i, j, k, m;
  double sum = 0.0;

  for (m = 0; m < NC; m++) {
    for (i = 0; i < 7; i++) {
      ce[m][i] = 0.05 * (m + 1) + 0.01 * i * (m + 2);
    }
  }
  initialize();
  for (k = 0; k < N; k++) {
    for (j = 0; j < N; j++) {
      for (i = 0; i < N; i++) {
        for (m = 0; m < NC; m++) {
          sum = sum + u[k][j][i][m] * (1.0 + 0.01 * (i + j + k + m));
        }
      }
    }
  }
  printf("checksum = %.12e\n", sum);
  return 0;
}
