/* CG inner solve: a parallel region per iteration with five worksharing loops. */
#include <stdio.h>
#include <math.h>

#define NA 256
#define NZ (NA * 5)
#define CGITMAX 6
#define NITER 4

int colidx[NZ];
int rowstr[NA + 1];
double a[NZ];
double x[NA];
double z[NA];
double p[NA];
double q[NA];
double r[NA];

double conj_grad(void)
{
  int j, k, cgit;
  double d, sum, rho, rho0, alpha, beta;

  rho = 0.0;
  for (j = 0; j < NA; j++) {
    q[j] = 0.0;
    z[j] = 0.0;
    r[j] = x[j];
    p[j] = r[j];
  }

  for (j = 0; j < NA; j++)
    rho = rho + r[j] * r[j];

  for (cgit = 1; cgit <= CGITMAX; cgit++) {
    d = 0.0;
    rho0 = rho;
    rho = 0.0;
#pragma omp parallel default(shared) private(j, k, sum, alpha, beta)
    {
#pragma omp for
      for (j = 0; j < NA; j++) {
        sum = 0.0;
        for (k = rowstr[j]; k < rowstr[j + 1]; k++) {
          sum = sum + a[k] * p[colidx[k]];
        }
        q[j] = sum;
      }

#pragma omp for reduction(+:d)
      for (j = 0; j < NA; j++)
        d = d + p[j] * q[j];

      alpha = rho0 / d;

#pragma omp for
      for (j = 0; j < NA; j++) {
        z[j] = z[j] + alpha * p[j];
        r[j] = r[j] - alpha * q[j];
      }

#pragma omp for reduction(+:rho)
      for (j = 0; j < NA; j++)
        rho = rho + r[j] * r[j];

      beta = rho / rho0;

#pragma omp for nowait
      for (j = 0; j < NA; j++)
        p[j] = r[j] + beta * p[j];
    }
  }

  for (j = 0; j < NA; j++) {
    d = 0.0;
    for (k = rowstr[j]; k < rowstr[j + 1]; k++) {
      d = d + a[k] * z[colidx[k]];
    }
    r[j] = d;
  }

  sum = 0.0;
  for (j = 0; j < NA; j++) {
    d = x[j] - r[j];
    sum = sum + d * d;
  }
  return sqrt(sum);
}

int main(void)
{
  int i, j, it, nz;
  double rnorm, norm, zeta;

  nz = 0;
  for (i = 0; i < NA; i++) {
    rowstr[i] = nz;
    for (j = i - 2; j <= i + 2; j++) {
      if (j >= 0 && j < NA) {
        colidx[nz] = j;
        a[nz] = i == j ? 4.0 + 0.01 * (i % 7) : -0.5 - 0.001 * ((i + j) % 5);
        nz++;
      }
    }
  }
  rowstr[NA] = nz;
  for (i = 0; i < NA; i++)
    x[i] = 1.0;

  zeta = 0.0;
  for (it = 1; it <= NITER; it++) {
    rnorm = conj_grad();
    norm = 0.0;
    zeta = 0.0;
    for (j = 0; j < NA; j++) {
      zeta = zeta + x[j] * z[j];
      norm = norm + z[j] * z[j];
    }
    norm = 1.0 / sqrt(norm);
    zeta = 10.0 + 1.0 / zeta;
    for (j = 0; j < NA; j++)
      x[j] = norm * z[j];
    printf("it %d rnorm = %.6e\n", it, rnorm);
  }
  printf("zeta = %.12e\n", zeta);
  return 0;
}
