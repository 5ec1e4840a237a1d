class C07 {
  int f(int x) {
    int y = x > 0 ? 1 : -1;
    return x > 10 && y > 0 ? y : 0;
  }
}
