/* EP: Gaussian deviates by acceptance-rejection, counted in annuli. */
#include <stdio.h>
#include <math.h>

#define M 16
#define MK 10
#define MM (M - MK)
#define NN (1 << MM)
#define NK (1 << MK)
#define NQ 10
#define EPSILON 1.0e-8
#define A 1220703125.0
#define S 271828183.0

double x[2 * NK];
#pragma omp threadprivate(x)
double q[NQ];

double randlc(double *x, double a)
{
  double r23, r46, t23, t46, t1, t2, t3, t4, a1, a2, x1, x2, z;
  int i;

  r23 = 1.0;
  for (i = 0; i < 23; i++)
    r23 = 0.5 * r23;
  r46 = r23 * r23;
  t23 = 1.0 / r23;
  t46 = t23 * t23;
  t1 = r23 * a;
  a1 = (int) t1;
  a2 = a - t23 * a1;
  t1 = r23 * *x;
  x1 = (int) t1;
  x2 = *x - t23 * x1;
  t1 = a1 * x2 + a2 * x1;
  t2 = (int) (r23 * t1);
  z = t1 - t23 * t2;
  t3 = t23 * z + a2 * x2;
  t4 = (int) (r46 * t3);
  *x = t3 - t46 * t4;
  return r46 * *x;
}

void vranlc(int n, double *x, double a, double y[])
{
  int i;

  for (i = 0; i < n; i++)
    y[i] = randlc(x, a);
}

int main(void)
{
  double Mops, t1, t2, t3, t4, x1, x2, sx, sy, an, gc;
  int np, i, ik, kk, l, k, nit, k_offset;

  for (i = 0; i < 2 * NK; i++)
    x[i] = -1.0e99;

  for (i = 0; i < NQ; i++)
    q[i] = 0.0;

  t1 = A;
  for (i = 0; i < MK + 1; i++)
    t2 = randlc(&t1, t1);

  an = t1;
  sx = 0.0;
  sy = 0.0;
  np = NN;
  nit = 0;
  k_offset = -1;

#pragma omp parallel for default(shared) private(k, kk, t1, t2, t3, t4, i, ik, x1, x2, l) reduction(+:sx, sy)
  for (k = 1; k <= np; k++) {
    kk = k_offset + k;
    t1 = S;
    t2 = an;
    for (i = 1; i <= 100; i++) {
      ik = kk / 2;
      if (2 * ik != kk)
        t3 = randlc(&t1, t2);
      if (ik == 0)
        break;
      t3 = randlc(&t2, t2);
      kk = ik;
    }
    vranlc(2 * NK, &t1, A, x);
    for (i = 0; i < NK; i++) {
      x1 = 2.0 * x[2 * i] - 1.0;
      x2 = 2.0 * x[2 * i + 1] - 1.0;
      t1 = x1 * x1 + x2 * x2;
      if (t1 <= 1.0) {
        t2 = sqrt(-2.0 * log(t1) / t1);
        t3 = x1 * t2;
        t4 = x2 * t2;
        l = (int) fmax(fabs(t3), fabs(t4));
#pragma omp atomic
        q[l] += 1.0;
        sx = sx + t3;
        sy = sy + t4;
      }
    }
  }

  gc = 0.0;
  for (i = 0; i < NQ; i++)
    gc = gc + q[i];

  Mops = pow(2.0, M + 1) / 1000000.0;
  printf("sx = %.12e sy = %.12e\n", sx, sy);
  printf("pairs = %.0f nit = %d mops = %.3f\n", gc, nit, Mops);
  for (i = 0; i < NQ; i++)
    printf("q[%d] = %.0f\n", i, q[i]);
  return 0;
}
