int main() {
  int a, b, r;
  scanf("%d %d %d", &a, &b, &r);
  if (a > 0 && b > 10) {
    r = a + b;
    r = r * 2;
  }
  if (a < 0 || b < -10) {
    r = a - b;
    r = r * 3;
  }
  printf("%d\n", r);
  return 0;
}
