int gcd(int a, int b) {
  int t;
  while (b != 0) {
    t = b;
    b = a / b;
    a = t;
  }
  return a;
}

int main() {
  int x, y;
  scanf("%d %d", &x, &y);
  printf("%d\n", gcd(x, y));
  return 0;
}
