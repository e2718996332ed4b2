# keyrate 模块
# 用于相干态连续变量QKD的高斯熵、信道方差与密钥率计算
